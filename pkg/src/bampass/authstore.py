"""Credential lifecycle over a BAM: enroll, verify, reverse-lookup, persist.

The store keeps the weight matrix and the username registry, never plaintext
passwords: verification recalls the enrolled password pattern from the
username and compares it bit-exactly with the offered one.

Known limitation, by construction: once several correlated users are
enrolled, crosstalk between stored pairs can corrupt recall and cause false
rejects. VerifyOutcome carries converged/sweeps to make that diagnosable.
This is a research artifact, not a production authenticator: no salting,
no hashing, no rate limiting.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path
from urllib.parse import quote, unquote

import numpy as np

from . import bam
from .core import IntVector
from .encoders import TextDecodeError, TextEncodingConfig, decode_text, encode_text
from .persist import (
    FORMAT_VERSION,
    LineCursor,
    StoreChecksumError,
    StoreFormatError,
    StoreVersionError,
    atomic_write_text,
    check_version,
    matrix_lines,
    parse_document,
    parse_matrix,
    read_text,
    render_document,
)

__all__ = [
    "CredentialStore",
    "VerifyOutcome",
    "ReverseLookupOutcome",
    "DuplicateUserError",
    "UnknownUserError",
    "VerificationFailedError",
    "StoreFormatError",
    "StoreVersionError",
    "StoreChecksumError",
    "create_store",
    "enroll",
    "verify",
    "de_enroll",
    "reverse_lookup",
    "dumps",
    "loads",
    "save",
    "load",
]

STORE_MAGIC = "bampass-store"

ACCEPT = "accept"
REJECT = "reject"
UNKNOWN_USER = "unknown_user"


class DuplicateUserError(ValueError):
    """Username is already enrolled."""


class UnknownUserError(KeyError):
    """Username is not in the registry."""


class VerificationFailedError(ValueError):
    """Offered credentials did not verify, so the store was left unchanged."""


@dataclass(frozen=True)
class CredentialStore:
    memory: bam.BamMemory
    user_cfg: TextEncodingConfig
    pass_cfg: TextEncodingConfig
    usernames: tuple[str, ...] = ()
    format_version: int = FORMAT_VERSION

    def __post_init__(self):
        object.__setattr__(self, "usernames", tuple(self.usernames))
        if len(set(self.usernames)) != len(self.usernames):
            raise ValueError("username registry contains duplicates")
        if len(self.usernames) != self.memory.pair_count:
            raise ValueError(
                f"registry has {len(self.usernames)} names but memory stores "
                f"{self.memory.pair_count} pairs"
            )
        if self.memory.m != self.user_cfg.vector_length:
            raise ValueError("memory rows do not match the username encoding length")
        if self.memory.n != self.pass_cfg.vector_length:
            raise ValueError("memory columns do not match the password encoding length")


@dataclass(frozen=True)
class VerifyOutcome:
    decision: str  # accept | reject | unknown_user
    recalled_matches_offered: bool
    sweeps: int
    converged: bool


@dataclass(frozen=True)
class ReverseLookupOutcome:
    recalled_username_vector: IntVector
    decoded: str | bytes
    unique_enrolled_match: bool
    sweeps: int
    converged: bool


def create_store(user_cfg: TextEncodingConfig, pass_cfg: TextEncodingConfig) -> CredentialStore:
    """Fresh store: zero weights sized (username bits x password bits)."""
    memory = bam.BamMemory.empty(user_cfg.vector_length, pass_cfg.vector_length)
    return CredentialStore(memory=memory, user_cfg=user_cfg, pass_cfg=pass_cfg)


def enroll(store: CredentialStore, username: str, password: str) -> CredentialStore:
    """Superimpose one username->password association; registry gains the name."""
    if username in store.usernames:
        raise DuplicateUserError(f"user {username!r} is already enrolled")
    user_vec = encode_text(username, store.user_cfg)
    pass_vec = encode_text(password, store.pass_cfg)
    memory = bam.add_pair(store.memory, (user_vec, pass_vec))
    return replace(store, memory=memory, usernames=store.usernames + (username,))


def verify(store: CredentialStore, username: str, password: str) -> VerifyOutcome:
    """Recall from the username pattern and compare bit-exactly (pure read).

    accept requires all three: enrolled username, converged recall, and a
    recalled pattern identical to the offered password's encoding. Wrong
    passwords yield reject, never an exception.
    """
    user_vec = encode_text(username, store.user_cfg)
    pass_vec = encode_text(password, store.pass_cfg)
    if username not in store.usernames:
        return VerifyOutcome(UNKNOWN_USER, False, 0, False)
    res = bam.recall(store.memory, user_vec)
    matches = bool(np.array_equal(res.b_final, pass_vec))
    decision = ACCEPT if (matches and res.converged) else REJECT
    return VerifyOutcome(decision, matches, res.sweeps, res.converged)


def de_enroll(store: CredentialStore, username: str, password: str) -> CredentialStore:
    """Inverse of enroll, gated on a successful verify.

    The gate prevents subtracting a pattern that was never stored, which
    would silently corrupt every other user's weights.
    """
    if username not in store.usernames:
        raise UnknownUserError(username)
    outcome = verify(store, username, password)
    if outcome.decision != ACCEPT:
        raise VerificationFailedError(
            f"credentials for {username!r} did not verify (decision={outcome.decision})"
        )
    user_vec = encode_text(username, store.user_cfg)
    pass_vec = encode_text(password, store.pass_cfg)
    memory = bam.remove_pair(store.memory, (user_vec, pass_vec))
    names = tuple(u for u in store.usernames if u != username)
    return replace(store, memory=memory, usernames=names)


def reverse_lookup(store: CredentialStore, password: str) -> ReverseLookupOutcome:
    """Recall a username pattern from a password (B-side recall).

    With several enrolled users sharing the password, the recalled vector is
    a superposition artifact; unique_enrolled_match is true only when the
    decoded string equals exactly one registry entry.
    """
    pass_vec = encode_text(password, store.pass_cfg)
    res = bam.recall_from_b(store.memory, pass_vec)
    decoded: str | bytes
    try:
        decoded = decode_text(res.a_final, store.user_cfg)
        unique = decoded in store.usernames
    except TextDecodeError as exc:
        decoded = exc.raw
        unique = False
    return ReverseLookupOutcome(res.a_final, decoded, unique, res.sweeps, res.converged)


def dumps(store: CredentialStore) -> str:
    """Canonical text serialization (see persist module for the envelope)."""
    u, p = store.user_cfg, store.pass_cfg
    lines = [
        f"format_version {store.format_version}",
        f"user_config {u.bits_per_char} {u.max_chars} {u.pad_byte}",
        f"pass_config {p.bits_per_char} {p.max_chars} {p.pad_byte}",
        f"dimensions {store.memory.m} {store.memory.n}",
        f"scale {store.memory.scale}",
        f"pair_count {store.memory.pair_count}",
        f"usernames {len(store.usernames)}",
        *[quote(name, safe="") for name in store.usernames],
        "weights",
        *matrix_lines(store.memory.weights),
    ]
    return render_document(STORE_MAGIC, lines)


def loads(text: str) -> CredentialStore:
    cursor = LineCursor(parse_document(text, STORE_MAGIC))
    (version,) = cursor.expect_ints("format_version", 1)
    check_version(version)
    ub, uc, up = cursor.expect_ints("user_config", 3)
    pb, pc, pp = cursor.expect_ints("pass_config", 3)
    m, n = cursor.expect_ints("dimensions", 2)
    (scale,) = cursor.expect_ints("scale", 1)
    (pair_count,) = cursor.expect_ints("pair_count", 1)
    (name_count,) = cursor.expect_ints("usernames", 1)
    names = tuple(unquote(cursor.next_line(f"username {i}")) for i in range(name_count))
    cursor.expect_literal("weights")
    weights = parse_matrix(cursor, m, n)
    cursor.done()
    user_cfg = TextEncodingConfig(ub, uc, up)
    pass_cfg = TextEncodingConfig(pb, pc, pp)
    try:
        memory = bam.BamMemory(weights, pair_count=pair_count, scale=scale)
        return CredentialStore(
            memory=memory,
            user_cfg=user_cfg,
            pass_cfg=pass_cfg,
            usernames=names,
            format_version=version,
        )
    except ValueError as exc:
        raise StoreFormatError(f"inconsistent store contents: {exc}") from exc


def save(store: CredentialStore, path: str | Path) -> None:
    """Persist atomically (write-temp-then-rename)."""
    atomic_write_text(path, dumps(store))


def load(path: str | Path) -> CredentialStore:
    return loads(read_text(path))
