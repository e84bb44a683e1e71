"""Order p^2 characters as towers (u0, z), and the minimal lift iteration."""
# %%
from fractions import Fraction as Fr

from swanlab import CharP, CharTower, LocalField, minimize_swan, ramification_datum, validate_thm1
from swanlab.conductor import MinimizeTrace

# %% break of p*chi above 1/(p-1): delta goes up by one, omega flips sign
K = LocalField.build(3, 1, N=6)
s = K.s()
chi = CharTower(K, K.one() + K.pi(Fr(1, 2)) * s, K.one() + K.pi(Fr(1, 3)) * s * s)
dat = ramification_datum(chi, auto_extend=True)
print(dat)
print("clauses:", sorted(validate_thm1(dat).clauses()))

# %% break 1/3 < 1/2: iterate towards sw = 3 * 1/3 = 1
K2 = LocalField.build(3, 2, N=6)
chibar = CharP(K2, K2.one() + K2.pi(Fr(7, 6)) * K2.s())
trace = MinimizeTrace()
lift = minimize_swan(chibar, trace=trace)
print("deltas along the iteration:", " -> ".join(str(st[0]) for st in trace.steps))
print("constants used: m =", lift.K.k.m)
print(ramification_datum(lift, auto_extend=True))
