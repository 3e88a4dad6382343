"""Field arithmetic and the three component codes, composed in :mod:`awtp.codes.codec`."""

from .codec import (
    AwtpParams,
    DecodeResult,
    EncodingCoins,
    awtp_decode,
    awtp_decode_verbose,
    awtp_derive_params,
    awtp_encode,
    awtp_encode_word,
    awtp_inner_word,
)
from .field import AffineSpace, PrimeField, as_ints, prime_field

__all__ = [
    "AffineSpace",
    "AwtpParams",
    "DecodeResult",
    "EncodingCoins",
    "PrimeField",
    "as_ints",
    "awtp_decode",
    "awtp_decode_verbose",
    "awtp_derive_params",
    "awtp_encode",
    "awtp_encode_word",
    "awtp_inner_word",
    "prime_field",
]
