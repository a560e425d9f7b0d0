"""Model inertia metrics for machine translation outputs."""

from ._kernels import BACKEND
from .align import (
    AlignConfig,
    AlignedPair,
    AlignmentModel,
    align_corpus,
    alignment_entropy,
    analyze_complexity,
    complexity,
    diagonal_prior,
    train,
    viterbi_align,
)
from .bleu import BleuConfig, BleuScore, bootstrap_ci, corpus_bleu, harmonic_mean
from .corpus import Corpus, SegmentScores, load_corpus, load_parallel, load_scores, mix_plt, save_corpus
from .errors import DataError
from .flips import nfi_categorical, nfr_categorical, nfr_scalar
from .inertia import (
    SmoothnessResult,
    StabilityResult,
    consistency,
    consistency_multi,
    exact_match_rate,
    robustness,
    robustness_bleu,
    stability,
    symmetrize,
)
from .noise import NoiseConfig, misspell_corpus, misspell_word
from .report import InertiaReport, emit
from .rng import Prng
from .text import levenshtein, tokenize_13a, tokenize_whitespace

__version__ = "0.1.0"
