import pytest
from hypothesis import given, strategies as st

from affectpipe.errors import FormatError
from affectpipe.io import default_vocabulary
from affectpipe.model import Emotion
from affectpipe.speech import RecognizedWord, Vocabulary, lookup, match_counts, normalize_token

DISGUST_WORDS = [
    "nasty", "foul", "bad", "ugly", "hideous", "awful", "terrible",
    "stink", "pathetic", "pitiful", "sick", "uggh", "eeks", "yuck",
]


@pytest.fixture(scope="module")
def vocab():
    return default_vocabulary()


def test_single_keyword_above_threshold(vocab):
    assert lookup([RecognizedWord("nasty", 0.5)], vocab) is Emotion.DISGUST


def test_below_threshold_abstains(vocab):
    assert lookup([RecognizedWord("nasty", 0.2)], vocab) is None


def test_at_threshold_abstains(vocab):
    # strictly-greater rule: 0.3 is not > 0.3
    assert lookup([RecognizedWord("nasty", 0.3)], vocab) is None


def test_two_matches_counted(vocab):
    words = [RecognizedWord("yuck", 0.9), RecognizedWord("terrible", 0.8)]
    assert lookup(words, vocab) is Emotion.DISGUST
    assert match_counts(words, vocab)[Emotion.DISGUST] == 2


def test_unknown_word_abstains(vocab):
    assert lookup([RecognizedWord("table", 0.99)], vocab) is None


def test_every_disgust_word_alone(vocab):
    for word in DISGUST_WORDS:
        assert lookup([RecognizedWord(word, 1.0)], vocab) is Emotion.DISGUST


def test_normalize_token():
    assert normalize_token("Nasty!") == "nasty"
    assert normalize_token("YUCK") == "yuck"
    assert normalize_token("...") is None
    assert normalize_token("  foul,  ") == "foul"


def test_tie_abstains():
    vocab = Vocabulary(
        entries={Emotion.DISGUST: {"bad"}, Emotion.ANGER: {"mad"}}, threshold=0.3
    )
    words = [RecognizedWord("bad", 0.9), RecognizedWord("mad", 0.9)]
    assert lookup(words, vocab) is None


def test_majority_wins():
    vocab = Vocabulary(
        entries={Emotion.DISGUST: {"bad"}, Emotion.ANGER: {"mad"}}, threshold=0.3
    )
    words = [
        RecognizedWord("bad", 0.9),
        RecognizedWord("mad", 0.9),
        RecognizedWord("mad", 0.8),
    ]
    assert lookup(words, vocab) is Emotion.ANGER


def test_confidence_bounds():
    with pytest.raises(FormatError):
        RecognizedWord("ok", 1.5)
    with pytest.raises(FormatError):
        RecognizedWord("", 0.5)


def test_vocabulary_disjointness_enforced():
    with pytest.raises(FormatError):
        Vocabulary(entries={Emotion.DISGUST: {"bad"}, Emotion.ANGER: {"bad"}})


@given(perm_seed=st.randoms(use_true_random=False))
def test_lookup_permutation_invariant(perm_seed):
    vocab = default_vocabulary()
    words = [
        RecognizedWord("nasty", 0.9),
        RecognizedWord("table", 0.99),
        RecognizedWord("yuck", 0.4),
        RecognizedWord("foul", 0.1),
    ]
    shuffled = list(words)
    perm_seed.shuffle(shuffled)
    assert lookup(shuffled, vocab) == lookup(words, vocab)


@given(threshold_pair=st.tuples(st.floats(0, 1), st.floats(0, 1)).map(sorted))
def test_threshold_monotone(threshold_pair):
    """Raising the threshold never increases any emotion's match count."""
    lo, hi = threshold_pair
    words = [
        RecognizedWord("nasty", 0.25),
        RecognizedWord("yuck", 0.5),
        RecognizedWord("awful", 0.75),
    ]
    low_vocab = Vocabulary(entries={Emotion.DISGUST: set(DISGUST_WORDS)}, threshold=lo)
    high_vocab = Vocabulary(entries={Emotion.DISGUST: set(DISGUST_WORDS)}, threshold=hi)
    low_counts = match_counts(words, low_vocab)
    high_counts = match_counts(words, high_vocab)
    for emotion, n in high_counts.items():
        assert n <= low_counts.get(emotion, 0)
