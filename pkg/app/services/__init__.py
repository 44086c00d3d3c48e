# Services: Dirac algebra, Hamiltonian, dynamics, Lie algebra and reports
