"""convexkit: numerical checks for superquadratic, phi-convex and uniformly
convex functions, their Jensen-type and Hermite-Hadamard inequalities, and
deviation-from-mean bounds."""

__version__ = "0.1.0"
