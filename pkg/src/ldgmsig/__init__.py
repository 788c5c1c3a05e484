"""LDGM sparse-syndrome signatures over GF(2).

Key generation, signing, and verification for a code-based signature
scheme built on sparse-generator (LDGM) codes with quasi-cyclic key
compression, together with the security estimators and the attack
experiments that motivate each countermeasure (see ldgmsig.attacks).
"""

from .digest import (
    CounterExhausted,
    digest_message,
    find_orthogonal,
    map_to_syndrome,
    rank_support,
    unrank,
)
from .fileio import (
    FormatError,
    load_private_key,
    load_public_key,
    load_signature,
    save_private_key,
    save_public_key,
    save_signature,
)
from .gf2 import BitVector, DenseMatrix, QcMatrix, SingularMatrixError
from .keygen import KeyGenerationError, PrivateKey, PublicKey, assemble
from .params import (
    ParameterError,
    ParameterSet,
    builtin_sets,
    get_params,
    security_report,
)
from .sign import Signature, SigningError, VerifyResult, sign, sign_trace, verify

__version__ = "0.1.0"

__all__ = [
    "BitVector",
    "CounterExhausted",
    "DenseMatrix",
    "FormatError",
    "KeyGenerationError",
    "ParameterError",
    "ParameterSet",
    "PrivateKey",
    "PublicKey",
    "QcMatrix",
    "Signature",
    "SigningError",
    "SingularMatrixError",
    "VerifyResult",
    "assemble",
    "builtin_sets",
    "digest_message",
    "find_orthogonal",
    "get_params",
    "load_private_key",
    "load_public_key",
    "load_signature",
    "map_to_syndrome",
    "rank_support",
    "save_private_key",
    "save_public_key",
    "save_signature",
    "security_report",
    "sign",
    "sign_trace",
    "unrank",
    "verify",
    "__version__",
]
