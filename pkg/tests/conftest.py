import numpy as np
import pytest

from affectpipe.model import Frame, Modality, Session


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)


def make_session(modality=Modality.HAND, n_frames=100, label=None, subject="s01", rng=None):
    rng = rng or np.random.default_rng(7)
    m = modality.point_count
    frames = tuple(
        Frame(index=i, points=rng.uniform(0, 640, size=(m, 2))) for i in range(n_frames)
    )
    return Session(subject_id=subject, modality=modality, frames=frames, label=label)
