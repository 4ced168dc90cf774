"""Extractive summarization as optimal transport between term distributions."""

__version__ = "0.1.0"

from .beam import BeamConfig, BeamResult, beam_search, generate_successors
from .bip import BipConfig, BipResult, bip_loss, bip_optimize, gumbel_binary_sample
from .embeddings import CostMatrix, EmbeddingTable, cost_matrix, load_embeddings, save_embeddings
from .errors import (
    AllSentencesEmpty,
    DimensionMismatch,
    EmptyDocument,
    EmptySelection,
    InfeasibleMarginals,
    MissingDuals,
    MissingReference,
    MissingToken,
    NonConvergence,
    NonConvergenceWarning,
    OTExtSumError,
    ParseError,
    ZeroNormVector,
)
from .ot import (
    SolverConfig,
    TransportPlan,
    coverage,
    grad_target_marginal,
    solve,
    solve_exact,
    solve_sinkhorn,
    wasserstein,
)
from .rouge import RougeScore, rouge_l, rouge_n, rouge_scores
from .text_model import (
    ActiveVocabulary,
    Document,
    document_distribution,
    load_stopwords,
    sentence_distribution,
    sentence_distributions,
    summary_distribution,
    tokenize,
)
