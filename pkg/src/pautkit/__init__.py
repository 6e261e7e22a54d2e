"""pautkit: partial automorphism monoids of finite graphs."""

__version__ = "0.1.0"
