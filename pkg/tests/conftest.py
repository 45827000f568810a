import numpy as np
import hypothesis.strategies as st

from kschannel import sphere_from_zphi


def unit_vectors():
    """Hypothesis strategy: points on the unit sphere via (z, azimuth)."""
    return st.builds(
        lambda z, phi: sphere_from_zphi(z, phi),
        st.floats(min_value=-1.0, max_value=1.0, allow_nan=False),
        st.floats(min_value=0.0, max_value=2.0 * np.pi, exclude_max=True, allow_nan=False),
    )
