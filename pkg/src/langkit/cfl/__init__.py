from .document import Document, GrammarDocument, MuDocument, TermsDocument
from .equivalence import Equivalent, Inequivalent, Unknown, bisim_upto, word_equiv
from .grammar import Alphabet, CFGrammar, GrammarSystem
from .polynomial import Polynomial
from .semiring import BOOLEAN, NATURAL, Semiring
from .terms import TermSystem

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "Alphabet",
    "BOOLEAN",
    "CFGrammar",
    "Document",
    "Equivalent",
    "GrammarDocument",
    "GrammarSystem",
    "Inequivalent",
    "MuDocument",
    "NATURAL",
    "Polynomial",
    "Semiring",
    "TermSystem",
    "TermsDocument",
    "Unknown",
    "bisim_upto",
    "word_equiv",
]
