"""Minimal signed ledger: ECDSA transactions in SHA-256 hash-chained blocks.

Serialization is canonical and bit-exact — fields in declaration order,
integers fixed-width big-endian, variable-length byte fields prefixed
with a u16 length — so signatures and block hashes are reproducible
across platforms. Amounts are stake-units encoded as u64 fixed-point
with six decimal places. Timestamps are simulation-clock integers
(round indexes), never wall time.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass

from cryptography.exceptions import InvalidSignature, UnsupportedAlgorithm
from cryptography.hazmat.primitives import hashes, serialization
from cryptography.hazmat.primitives.asymmetric import ec
from cryptography.hazmat.primitives.asymmetric.utils import Prehashed

CURVES = {
    "secp256r1": ec.SECP256R1,
    "secp256k1": ec.SECP256K1,
    "secp384r1": ec.SECP384R1,
}
DEFAULT_CURVE = "secp256r1"

GENESIS_PREV_HASH = bytes(32)
AMOUNT_DECIMALS = 6
_AMOUNT_SCALE = 10**AMOUNT_DECIMALS
_MAX_AMOUNT_UNITS = 2**64 - 1


class LedgerError(ValueError):
    pass


def _curve(name: str):
    try:
        return CURVES[name]()
    except KeyError:
        raise LedgerError(f"unknown curve {name!r}; pick one of {sorted(CURVES)}") from None


def new_keypair(rng, curve: str = DEFAULT_CURVE):
    """Deterministic keypair from the given random stream.

    The private scalar is assembled from 32-bit draws and reduced into
    the curve's scalar range, so identical seeds yield identical keys.
    Returns (private key object, compressed public key bytes).
    """
    c = _curve(curve)
    nwords = (c.key_size + 31) // 32 + 2  # extra words make reduction bias negligible
    raw = 0
    for _ in range(nwords):
        raw = (raw << 32) | int(rng.integers(0, 2**32))
    value = raw % (2**c.key_size - 3) + 1
    while True:
        try:
            priv = ec.derive_private_key(value, c)
            break
        except ValueError:  # pragma: no cover - scalar above group order, ~2^-32
            value = (value * 2654435761 + 12345) % (2**c.key_size - 3) + 1
    pub = priv.public_key().public_bytes(
        serialization.Encoding.X962, serialization.PublicFormat.CompressedPoint
    )
    return priv, pub


def _amount_units(amount: float) -> int:
    if amount < 0:
        raise LedgerError(f"amount must be non-negative, got {amount}")
    units = round(amount * _AMOUNT_SCALE)
    if units > _MAX_AMOUNT_UNITS:
        raise LedgerError(f"amount {amount} overflows the 64-bit fixed-point range")
    return int(units)


def _bytes_field(b: bytes) -> bytes:
    if len(b) > 0xFFFF:
        raise LedgerError("byte field longer than a u16 length prefix allows")
    return struct.pack(">H", len(b)) + b


@dataclass(frozen=True)
class Transaction:
    sender: bytes
    recipient: bytes
    amount: float
    nonce: int
    signature: bytes = b""


def transaction_signing_bytes(sender: bytes, recipient: bytes, amount: float, nonce: int) -> bytes:
    """Canonical unsigned serialization — exactly what the sender signs."""
    if nonce < 0:
        raise LedgerError("nonce must be non-negative")
    return (
        _bytes_field(sender)
        + _bytes_field(recipient)
        + struct.pack(">Q", _amount_units(amount))
        + struct.pack(">Q", nonce)
    )


def serialize_transaction(tx: Transaction) -> bytes:
    """Signed canonical form: unsigned bytes plus the length-prefixed signature."""
    return (
        transaction_signing_bytes(tx.sender, tx.recipient, tx.amount, tx.nonce)
        + _bytes_field(tx.signature)
    )


def sign_transaction(private_key, recipient: bytes, amount: float, nonce: int) -> Transaction:
    """Build and sign a transaction with the key holder as sender.

    Uses deterministic ECDSA so rerunning a seeded simulation produces
    byte-identical signatures.
    """
    sender = private_key.public_key().public_bytes(
        serialization.Encoding.X962, serialization.PublicFormat.CompressedPoint
    )
    payload = transaction_signing_bytes(sender, recipient, amount, nonce)
    digest = hashlib.sha256(payload).digest()
    sig = private_key.sign(
        digest, ec.ECDSA(Prehashed(hashes.SHA256()), deterministic_signing=True)
    )
    return Transaction(sender=sender, recipient=recipient, amount=amount, nonce=nonce, signature=sig)


def verify_transaction(tx: Transaction, curve: str = DEFAULT_CURVE) -> bool:
    """True iff the signature verifies under the sender's key.

    Malformed keys or signature bytes count as verification failures,
    never crashes.
    """
    try:
        payload = transaction_signing_bytes(tx.sender, tx.recipient, tx.amount, tx.nonce)
    except LedgerError:
        return False
    digest = hashlib.sha256(payload).digest()
    try:
        pub = ec.EllipticCurvePublicKey.from_encoded_point(_curve(curve), tx.sender)
        pub.verify(tx.signature, digest, ec.ECDSA(Prehashed(hashes.SHA256())))
        return True
    except (InvalidSignature, ValueError, TypeError, UnsupportedAlgorithm):
        return False


@dataclass(frozen=True)
class Block:
    index: int
    timestamp: int
    prev_hash: bytes
    transactions: tuple
    hash: bytes


def block_payload(index: int, timestamp: int, prev_hash: bytes, transactions) -> bytes:
    """Canonical block serialization (the preimage of the block hash)."""
    if len(prev_hash) != 32:
        raise LedgerError(f"prev_hash must be 32 bytes, got {len(prev_hash)}")
    out = [struct.pack(">Q", index), struct.pack(">Q", timestamp), prev_hash,
           struct.pack(">I", len(transactions))]
    out.extend(serialize_transaction(tx) for tx in transactions)
    return b"".join(out)


def block_hash(index: int, timestamp: int, prev_hash: bytes, transactions) -> bytes:
    return hashlib.sha256(block_payload(index, timestamp, prev_hash, transactions)).digest()


def make_block(index: int, timestamp: int, prev_hash: bytes, transactions) -> Block:
    txs = tuple(transactions)
    return Block(index, timestamp, prev_hash, txs,
                 block_hash(index, timestamp, prev_hash, txs))


def genesis_block() -> Block:
    return make_block(0, 0, GENESIS_PREV_HASH, ())


def build_block(parent: Block, transactions, clock: int) -> Block:
    """Next block on top of parent, stamped with the simulation clock."""
    return make_block(parent.index + 1, int(clock), parent.hash, transactions)


def block_rejection_reason(chain: "Chain", block: Block, curve: str = DEFAULT_CURVE):
    """Why this block cannot extend the chain, or None if it can.

    Checks, in order: hash recomputation, index linkage, parent-hash
    linkage, and every transaction signature.
    """
    try:
        recomputed = block_hash(block.index, block.timestamp, block.prev_hash, block.transactions)
    except LedgerError as e:
        return f"unserializable block: {e}"
    if recomputed != block.hash:
        return "hash mismatch: stored hash does not recompute from contents"
    tip = chain.tip()
    if block.index != tip.index + 1:
        return f"stale index: expected {tip.index + 1}, got {block.index}"
    if block.prev_hash != tip.hash:
        return "linkage: prev_hash does not match the chain tip"
    for i, tx in enumerate(block.transactions):
        if not verify_transaction(tx, curve):
            return f"invalid tx at position {i}: signature does not verify"
    return None


def validate_block(chain: "Chain", block: Block, curve: str = DEFAULT_CURVE) -> bool:
    return block_rejection_reason(chain, block, curve) is None


class Chain:
    """Genesis-rooted block list; append is the only mutation."""

    def __init__(self, curve: str = DEFAULT_CURVE):
        self.curve = curve
        self.blocks: list[Block] = [genesis_block()]

    def tip(self) -> Block:
        return self.blocks[-1]

    def height(self) -> int:
        """Number of blocks after genesis."""
        return len(self.blocks) - 1

    def __len__(self) -> int:
        return len(self.blocks)

    def append(self, block: Block) -> None:
        reason = block_rejection_reason(self, block, self.curve)
        if reason is not None:
            raise LedgerError(f"block rejected: {reason}")
        self.blocks.append(block)

    def validate_all(self) -> bool:
        """Re-check linkage and hashes over the whole chain."""
        g = self.blocks[0]
        if g.index != 0 or g.prev_hash != GENESIS_PREV_HASH:
            return False
        if block_hash(g.index, g.timestamp, g.prev_hash, g.transactions) != g.hash:
            return False
        for parent, child in zip(self.blocks, self.blocks[1:]):
            if child.index != parent.index + 1 or child.prev_hash != parent.hash:
                return False
            if block_hash(child.index, child.timestamp, child.prev_hash, child.transactions) != child.hash:
                return False
            if not all(verify_transaction(tx, self.curve) for tx in child.transactions):
                return False
        return True

    def to_json(self) -> dict:
        """Chain export with hex digests (diagnostic form, not canonical)."""
        return {
            "curve": self.curve,
            "blocks": [
                {
                    "index": b.index,
                    "timestamp": b.timestamp,
                    "prev_hash": b.prev_hash.hex(),
                    "hash": b.hash.hex(),
                    "transactions": [
                        {
                            "sender": tx.sender.hex(),
                            "recipient": tx.recipient.hex(),
                            "amount": tx.amount,
                            "nonce": tx.nonce,
                            "signature": tx.signature.hex(),
                        }
                        for tx in b.transactions
                    ],
                }
                for b in self.blocks
            ],
        }
