"""Non-kissing complexes of gentle quivers."""
__version__ = "0.1.0"
