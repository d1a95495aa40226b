try:
    from ._voi import (  # noqa: F401
        CostModel,
        MisclassificationMatrix,
        Network,
        ValidationError,
        ZeroProbabilityEvidence,
        calibrate,
        evi_table,
        irreducible_sets,
        policy_etc,
        policy_json,
    )
except ImportError:  # in-tree builds put _voi on sys.path directly
    from _voi import (  # noqa: F401
        CostModel,
        MisclassificationMatrix,
        Network,
        ValidationError,
        ZeroProbabilityEvidence,
        calibrate,
        evi_table,
        irreducible_sets,
        policy_etc,
        policy_json,
    )

__all__ = [
    "CostModel",
    "MisclassificationMatrix",
    "Network",
    "ValidationError",
    "ZeroProbabilityEvidence",
    "calibrate",
    "evi_table",
    "irreducible_sets",
    "policy_etc",
    "policy_json",
]
