"""Bit-level codec shared by every labeling scheme.

Labels are bit strings.  The codec fixes one global convention: bits are
MSB-first, storage is 32-bit words (kept in int64 numpy arrays so the same
arithmetic runs under numba and pure Python), and serialization is the hex
of the big-endian byte string with zero padding in the final partial byte.

Self-delimiting fields use a two-level header.  ``width_for(k)`` bits hold
a value known to lie in ``[0, k)``:

    width_for(k) = max(1, bit_length(k - 1))

To transmit a value ``v`` with no a-priori bound, ``write_uint`` sends the
header for ``k = v + 1`` followed by ``v`` in ``width_for(v + 1)`` bits.
The header for a payload width ``w`` is ``z`` zeros, a one, then ``w - 1``
in ``z`` bits, where ``z = bit_length(w - 1)``; total cost
``2*z + 1 + w = w + O(log w)`` bits.
"""

import numpy as np

__all__ = [
    "CodecError",
    "BitString",
    "BitWriter",
    "BitCursor",
    "LabelBuffer",
    "width_for",
    "header_cost",
    "uint_cost",
]


class CodecError(ValueError):
    """Malformed field, out-of-range value, or read past the end."""


def width_for(k: int) -> int:
    """Bits needed for a value in ``[0, k)``, clamped to at least 1.

    Equals ``ceil(log2(max(k, 2)))``.

    Args:
        k: exclusive upper bound, ``k >= 1``.

    Raises:
        CodecError: if ``k < 1``.
    """
    if k < 1:
        raise CodecError(f"width_for needs k >= 1, got {k}")
    return max(1, (int(k) - 1).bit_length())


def header_cost(k: int) -> int:
    """Bit cost of the two-level width header for bound ``k``."""
    z = (width_for(k) - 1).bit_length()
    return 2 * z + 1


def uint_cost(v: int) -> int:
    """Total bits ``write_uint(v)`` emits."""
    w = width_for(v + 1)
    return header_cost(v + 1) + w


class BitString:
    """Immutable bit string.

    Attributes:
        words: int64 array of 32-bit words, MSB-first, zero-padded.
        nbits: number of valid bits.
    """

    __slots__ = ("words", "nbits")

    def __init__(self, words: np.ndarray, nbits: int):
        self.words = words
        self.nbits = int(nbits)

    def __len__(self) -> int:
        return self.nbits

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitString):
            return NotImplemented
        return self.nbits == other.nbits and bool(
            np.array_equal(self.words, other.words)
        )

    def __hash__(self):
        return hash((self.nbits, self.words.tobytes()))

    def bit(self, i: int) -> int:
        """Bit at position ``i`` (0 = most significant)."""
        if not 0 <= i < self.nbits:
            raise CodecError(f"bit index {i} out of range [0, {self.nbits})")
        return int(self.words[i >> 5] >> (31 - (i & 31))) & 1

    def to01(self) -> str:
        """The bits as a '0'/'1' string (small labels, tests)."""
        return "".join(str(self.bit(i)) for i in range(self.nbits))

    @classmethod
    def from01(cls, s: str) -> "BitString":
        w = BitWriter()
        for ch in s:
            if ch not in "01":
                raise CodecError(f"bad bit character {ch!r}")
            w.write_fixed(int(ch), 1)
        return w.freeze()

    def to_hex(self) -> str:
        """Big-endian hex, one character pair per byte, padded with zeros."""
        nbytes = (self.nbits + 7) // 8
        raw = self.words.astype(np.uint32).astype(">u4").tobytes()
        return raw[:nbytes].hex()

    @classmethod
    def from_hex(cls, hex_str: str, nbits: int) -> "BitString":
        """Inverse of :meth:`to_hex`.

        Raises:
            CodecError: on bad hex, length mismatch, or nonzero pad bits.
        """
        try:
            raw = bytes.fromhex(hex_str)
        except ValueError as e:
            raise CodecError(f"bad hex: {e}") from None
        if len(raw) != (nbits + 7) // 8:
            raise CodecError(
                f"hex length {len(raw)} bytes does not match {nbits} bits"
            )
        pad = -len(raw) % 4
        words = np.frombuffer(raw + b"\x00" * pad, dtype=">u4").astype(np.int64)
        # byte padding caps the tail below 32 bits, all inside the last word
        tail = len(words) * 32 - nbits
        if tail and int(words[-1]) & ((1 << tail) - 1):
            raise CodecError("nonzero bits beyond nbits")
        return cls(words, nbits)

    def __repr__(self):
        shown = self.to01() if self.nbits <= 64 else self.to01()[:61] + "..."
        return f"BitString({shown!r}, nbits={self.nbits})"


class BitWriter:
    """Appends fields MSB-first; ``freeze()`` yields the BitString."""

    __slots__ = ("_acc", "_nbits")

    def __init__(self):
        self._acc = 0
        self._nbits = 0

    def __len__(self) -> int:
        return self._nbits

    def write_fixed(self, value: int, width: int) -> None:
        """Append ``value`` in exactly ``width`` bits.

        Width 0 is legal and writes nothing (the value must then be 0);
        fixed-width distance lists rely on this.

        Raises:
            CodecError: if ``value`` is negative or does not fit.
        """
        value = int(value)
        if width < 0:
            raise CodecError(f"negative width {width}")
        if value < 0 or value >> width:
            raise CodecError(f"value {value} does not fit in {width} bits")
        self._acc = (self._acc << width) | value
        self._nbits += width

    def write_unary_header(self, k: int) -> int:
        """Append the width header for bound ``k``; returns the payload width."""
        w = width_for(k)
        z = (w - 1).bit_length()
        self.write_fixed(1, z + 1)  # z zeros then a one
        self.write_fixed(w - 1, z)
        return w

    def write_uint(self, value: int) -> None:
        """Append a self-delimiting unsigned integer (any value >= 0)."""
        if value < 0:
            raise CodecError(f"write_uint needs value >= 0, got {value}")
        w = self.write_unary_header(value + 1)
        self.write_fixed(value, w)

    def freeze(self) -> BitString:
        nbits = self._nbits
        nwords = (nbits + 31) >> 5
        acc = self._acc << (-nbits % 32)
        words = np.zeros(nwords, dtype=np.int64)
        for i in range(nwords - 1, -1, -1):
            words[i] = acc & 0xFFFFFFFF
            acc >>= 32
        return BitString(words, nbits)


class BitCursor:
    """Sequential reader over a BitString.

    Reads past the end raise :class:`CodecError`, never wrap or zero-fill.
    """

    __slots__ = ("_bits", "pos")

    def __init__(self, bits: BitString):
        self._bits = bits
        self.pos = 0

    def remaining(self) -> int:
        return self._bits.nbits - self.pos

    def read_fixed(self, width: int) -> int:
        """Read ``width`` bits as an unsigned int (arbitrary width)."""
        if width < 0:
            raise CodecError(f"negative width {width}")
        if width > self.remaining():
            raise CodecError(
                f"read of {width} bits at position {self.pos} passes the end"
                f" ({self._bits.nbits} bits)"
            )
        words = self._bits.words
        pos = self.pos
        acc = 0
        got = 0
        while got < width:
            idx = (pos + got) >> 5
            bo = (pos + got) & 31
            take = min(32 - bo, width - got)
            chunk = (int(words[idx]) >> (32 - bo - take)) & ((1 << take) - 1)
            acc = (acc << take) | chunk
            got += take
        self.pos += width
        return acc

    def read_unary_header(self) -> int:
        """Read a width header; returns the payload width."""
        z = 0
        while self.read_fixed(1) == 0:
            z += 1
            if z > 64:
                raise CodecError("runaway width header")
        return self.read_fixed(z) + 1

    def read_uint(self) -> int:
        w = self.read_unary_header()
        return self.read_fixed(w)


class LabelBuffer:
    """A packed batch of labels: one words array, per-label offsets.

    Kernels read and write labels in place; ``__getitem__`` materializes a
    single label as a BitString (word-aligned slice copy).
    """

    __slots__ = ("words", "starts", "nbits")

    def __init__(self, words: np.ndarray, starts: np.ndarray, nbits: np.ndarray):
        self.words = words
        self.starts = starts  # bit offset of each label, word-aligned
        self.nbits = nbits

    def __len__(self) -> int:
        return len(self.starts)

    def __getitem__(self, i: int) -> BitString:
        start = int(self.starts[i])
        if start & 31:
            raise CodecError("label start is not word-aligned")
        w0 = start >> 5
        nb = int(self.nbits[i])
        w1 = w0 + ((nb + 31) >> 5)
        return BitString(self.words[w0:w1].copy(), nb)

    @classmethod
    def from_bitstrings(cls, labels) -> "LabelBuffer":
        starts = np.zeros(len(labels), dtype=np.int64)
        nbits = np.zeros(len(labels), dtype=np.int64)
        chunks = []
        pos = 0
        for i, b in enumerate(labels):
            starts[i] = pos
            nbits[i] = b.nbits
            chunks.append(b.words)
            pos += len(b.words) * 32
        words = (
            np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64)
        )
        return cls(words, starts, nbits)
