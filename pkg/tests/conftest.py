import numpy as np
import pytest
from hypothesis import settings, strategies as st

from freecorr.bitstream import BitStream
from freecorr.words import Letter, ObservableSymbol, Polynomial

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

NAMES = "ABCD"


@st.composite
def symbols(draw, identity=True):
    if identity and draw(st.integers(0, 7)) == 0:
        return ObservableSymbol.identity()
    return ObservableSymbol(draw(st.sampled_from(NAMES)), draw(st.booleans()))


@st.composite
def letters(draw, max_copy=3):
    syms = draw(st.lists(symbols(), min_size=1, max_size=2))
    return Letter(draw(st.integers(1, max_copy)), syms)


letter_lists = st.lists(letters(), max_size=6)


@st.composite
def polynomials(draw):
    terms = draw(st.lists(st.tuples(st.integers(-3, 3), letter_lists), max_size=3))
    out = Polynomial.zero()
    for c, ls in terms:
        out = out + Polynomial.from_word(ls, c)
    return out


@st.composite
def streams(draw):
    kind = draw(st.sampled_from(["constant", "periodic", "thue-morse", "bernoulli"]))
    if kind == "constant":
        return BitStream.constant(draw(st.integers(0, 1)))
    if kind == "periodic":
        return BitStream.periodic(draw(st.lists(st.integers(0, 1), min_size=1, max_size=5)))
    if kind == "thue-morse":
        return BitStream.thue_morse()
    return BitStream.bernoulli(0.5, draw(st.integers(0, 2**31)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
