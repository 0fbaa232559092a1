# Guaranteed State Estimation - set-based observers for nonlinear discrete-time systems
