"""Multi-time correlations, asymptotic free algebras and their independence laws."""
from .bitstream import BitStream, parse_stream
from .kernels import BACKEND
from .laws import MarginalState, evaluate, free_moment, koopman_moment, tensor_moment
from .shift import TimedWord, expectation, free_shift_expectation
from .words import Letter, ObservableSymbol, Polynomial, Word, normalize

__all__ = [
    "BACKEND", "BitStream", "Letter", "MarginalState", "ObservableSymbol", "Polynomial",
    "TimedWord", "Word", "evaluate", "expectation", "free_moment", "free_shift_expectation",
    "koopman_moment", "normalize", "parse_stream", "tensor_moment",
]
__version__ = "0.1.0"
