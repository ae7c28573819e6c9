"""Fuzzy-clause Tsetlin Machine training and inference engine."""

from .bits import BitSample, pack_bits, unpack_bits
from .booleanize import ImageBooleanizer, TextBooleanizer, booleanizer_from_dict
from .clause_eval import (ClassSum, ClauseVote, class_sum, clause_failed,
                          evaluate_bank, evaluate_clause)
from .dataset_io import (BitDataset, load_idx, load_imdb_dir, read_container,
                         write_container)
from .heuristics import HyperSuggestion, suggest_S, suggest_T
from .inference import (PackedModel, ThroughputReport, failed_count, pack_model,
                        predict, predict_batch)
from .model import (Clause, ClauseBank, Hyperparameters, Model, load_model,
                    new_model, save_model, sync_include_mask)
from .presets import PRESETS, get_preset
from .training import (EpochReport, FeedbackConfig, fit, type_ia_feedback,
                       type_ib_feedback, type_ii_feedback, update_on_sample)

__version__ = "0.1.0"

__all__ = [
    "BitSample", "pack_bits", "unpack_bits",
    "ImageBooleanizer", "TextBooleanizer", "booleanizer_from_dict",
    "ClassSum", "ClauseVote", "class_sum", "clause_failed",
    "evaluate_bank", "evaluate_clause",
    "BitDataset", "load_idx", "load_imdb_dir", "read_container", "write_container",
    "HyperSuggestion", "suggest_S", "suggest_T",
    "PackedModel", "ThroughputReport", "failed_count", "pack_model",
    "predict", "predict_batch",
    "Clause", "ClauseBank", "Hyperparameters", "Model", "load_model",
    "new_model", "save_model", "sync_include_mask",
    "PRESETS", "get_preset",
    "EpochReport", "FeedbackConfig", "fit", "type_ia_feedback",
    "type_ib_feedback", "type_ii_feedback", "update_on_sample",
]
