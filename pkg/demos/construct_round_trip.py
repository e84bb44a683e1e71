"""Build characters from ramification data and read the data back."""
# %%
import json
from fractions import Fraction as Fr

from swanlab import (construct_from_datum, datum_from_json, datum_to_json, enumerate_valid_data,
                     ramification_datum, validate_thm1)

# %% a datum in JSON form: delta_1 = 1/3 with ds, delta_2 = 1 with s^2 ds
text = '{"p": 3, "pairs": [{"delta": "1/3", "omega": "s"}, {"delta": "1", "omega": "s^3"}]}'
dat = datum_from_json(text)
print("valid:", validate_thm1(dat).passed)
chi = construct_from_datum(dat)
print("character:", chi)
print("recomputed:", json.dumps(datum_to_json(ramification_datum(chi, auto_extend=True))))

# %% a few data from the enumerator, one per clause of the case analysis
seen = set()
for d in enumerate_valid_data(3, Fr(1, 6), 2, seed=2):
    tag = max(validate_thm1(d).clauses(), key=len)
    if tag in seen or len(d) < 2:
        continue
    seen.add(tag)
    back = ramification_datum(construct_from_datum(d), auto_extend=True)
    print(f"{tag:11s} {d}  round trip ok: {back == d}")
