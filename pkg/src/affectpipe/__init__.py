"""Offline multimodal affect recognition pipeline.

Tracked-point streams, face-snapshot smile detection and speech keyword
lookup are classified per modality and fused into a per-session verdict.
"""

__version__ = "0.1.0"

from .model import Emotion, Modality, Frame, Session, emotion_from_code, validate_session  # noqa: F401
