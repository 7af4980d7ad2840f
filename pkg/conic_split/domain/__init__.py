"""
Domain layer - conic programs and the methods that solve them, with zero I/O.

This package contains:
- value_objects.py: cone specs, options, schedules and policies
- entities.py: ConicProgram, Solution, ResidualReport, solver state
- errors.py: DomainError hierarchy
- ports.py: storage port interfaces
- cones.py / subspace.py: projection and reflection operators
- residuals.py: validation and residual evaluation
- splitting.py: the splitting iteration
- conditioning.py: adaptive conditioning and static preconditioning
- baselines.py: Douglas-Rachford and ADMM
- generators.py: random instances and the bundled example
- stopping.py / driver.py: termination and the shared iteration loop
"""
