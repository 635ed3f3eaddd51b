"""Distributed-CRC-aided 5G-NR polar codes: encoding, CK/CR/CS list decoding and AWGN simulation."""

__version__ = "0.1.0"
