"""Tree types, compatibility checking, head-binarization and l-tree conversion."""
from jointparse.trees.binarize import head_binarize
from jointparse.trees.compat import check_compatibility, is_projective
from jointparse.trees.ltree import (
    build_ltree,
    ltree_to_ctree,
    ltree_to_dtree,
    ltree_with_labels,
    validate_ltree,
)
from jointparse.trees.types import (
    NULL_LABEL,
    Arc,
    CompatReason,
    CompatReport,
    Constituent,
    CTree,
    DTree,
    LexSpan,
    LTree,
    Sentence,
)

__all__ = [
    "head_binarize",
    "check_compatibility",
    "is_projective",
    "build_ltree",
    "ltree_to_ctree",
    "ltree_to_dtree",
    "ltree_with_labels",
    "validate_ltree",
    "NULL_LABEL",
    "Arc",
    "CompatReason",
    "CompatReport",
    "Constituent",
    "CTree",
    "DTree",
    "LexSpan",
    "LTree",
    "Sentence",
]
