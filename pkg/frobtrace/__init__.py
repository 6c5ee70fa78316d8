"""
frobtrace: traces of Frobenius of elliptic curves over F_q via Gaussian
hypergeometric series, checked against brute-force point counts.
"""

__version__ = "0.1.0"
