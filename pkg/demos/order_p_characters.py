"""Order p characters: Kummer reduction, Swan conductor, norm oracle, lower break."""
# %%
from fractions import Fraction as Fr

from swanlab import CharP, LocalField, kummer_reduce, swan_p, swan_p_norm_oracle
from swanlab.fierce_extension import make_extension
from swanlab.valuation_lattice import BreakSequence, psi_of_breaks

K = LocalField.build(p=3, m=1, N=6)   # constants with pi^6 = -3
s = K.s()

# %% a unit whose residue is not a cube
red, mult = kummer_reduce(s)
print("s             ->", red.kind, red.ubar)

# %% 1 + pi_{1/2} s: residue 1, the reduction lands in the second shape
u = K.one() + K.pi(Fr(1, 2)) * s
red, mult = kummer_reduce(u)
print("1+pi[1/2]*s   ->", red.kind, "t =", red.t, "wbar =", red.wbar)

# %% Swan conductor two ways
for expr, unit in [("s", s), ("1+pi[1/2]*s", u), ("1+pi[1/2]*(s^2+s)", K.one() + K.pi(Fr(1, 2)) * (s * s + s))]:
    chi = CharP(K, unit)
    a, b = swan_p(chi), swan_p_norm_oracle(chi)
    print(f"{expr:20s} delta={a.delta}  omega={a.omega}  oracle agrees: {a == b}")

# %% the generator moves by psi(delta)
for unit in (s, u):
    chi = CharP(K, unit)
    M = make_extension(chi.reduced)
    delta = swan_p(chi).delta
    print("v(sigma x - x) =", M.displacement(), " psi(delta) =",
          psi_of_breaks(BreakSequence(3, [delta]))(delta))
