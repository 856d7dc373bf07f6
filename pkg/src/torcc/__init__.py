"""torcc: exact workbench for toric-stack lattice data and polyhedral sheaf calculus."""

__version__ = "0.1.0"
