"""Multi-twisted Goppa codes: construction, decoding, Niederreiter PKC,
key-recovery experiments and quasi-cyclic constructions."""

__version__ = "0.1.0"
