"""tenantsim: multi-tenant execution of DNN workloads on one weight-stationary
systolic array, with dynamic vertical partitioning, a functional PE-array
core, and cross-validated timing/energy models."""

__version__ = "0.1.0"
