"""Computer algebra for the quantum SL(2) group and its q-special functions.

Submodules
----------
scalar     exact Laurent-rational scalars in v = q^(1/2) and arbitrary-precision
           numeric scalars with explicit precision tracking
qseries    q-Pochhammer symbols, basic hypergeometric series, q-integrals
orthopoly  q-orthogonal polynomial families, Askey-Wilson measures, quadrature
qalgebra   PBW normal forms, Hopf structure, duality pairing and Haar functional
           for the quantized enveloping / function algebras of SL(2) and of the
           motion group of the plane
reps       representations: spin matrices, infinite-dimensional *-representations,
           matrix elements, Clebsch-Gordan coefficients, traces
verify     numeric verification suites for the main identities
cli        command line front end
"""

__version__ = "0.1.0"
