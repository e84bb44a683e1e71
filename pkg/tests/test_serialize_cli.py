import json
import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, strategies as st

from swanlab.cli import Config, main
from swanlab.datum import RamDatum, RamPair
from swanlab.errors import InvalidInput
from swanlab.local_field import LocalField
from swanlab.residue_field import DiffForm, RatFun, get_fq, random_ratfun
from swanlab.serialize import (datum_from_json, datum_to_json, format_elem, format_ratfun,
                               parse_elem, parse_ratfun)

K6 = LocalField.build(3, 1, 1, 6)


def test_parse_elem():
    x = parse_elem("1 + pi[1/2]*s", K6)
    assert (x - (K6.one() + K6.pi(Fr(1, 2)) * K6.s())).X is None
    y = parse_elem("(s^3+1)/(s-2)", K6)
    assert y.residue() == parse_ratfun("(s^3+1)/(s-2)", K6.F)
    assert (parse_elem("zeta_p - 1", K6) - K6.lam()).X is None
    for bad in ["zeta_p2", "s^(1/2)", "t + 1", "1 +", "pi[s]"]:
        with pytest.raises(InvalidInput):
            parse_elem(bad, K6)


@given(seed=st.integers(0, 10 ** 9))
def test_format_parse_round_trip(seed):
    rng = random.Random(seed)
    a = K6.lift(random_ratfun(K6.F, 2, rng, den_deg=1))
    x = a + K6.lift(random_ratfun(K6.F, 2, rng, den_deg=0)).shift(Fr(rng.randrange(1, 12), 6))
    back = parse_elem(format_elem(x), K6)
    assert (back - x).X is None


def test_ratfun_round_trip_fq2():
    F9 = get_fq(3, 2)
    rng = random.Random(2)
    for _ in range(20):
        a = random_ratfun(F9, 3, rng, den_deg=2)
        assert parse_ratfun(format_ratfun(a), F9) == a


def test_datum_json():
    F = get_fq(3)
    dat = RamDatum(3, [RamPair(Fr(1, 3), DiffForm.ds(F)),
                       RamPair(Fr(1), DiffForm(RatFun.s(F) ** 3))])
    js = datum_to_json(dat)
    assert js == {"p": 3, "pairs": [{"delta": "1/3", "omega": "s"},
                                    {"delta": "1", "omega": "s^3"}]}
    assert datum_from_json(json.dumps(js)) == dat
    with pytest.raises(InvalidInput):
        datum_from_json({"p": 3})


def test_config_checks():
    with pytest.raises(InvalidInput):
        Config(p=4)
    with pytest.raises(InvalidInput):
        Config(prec=3)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_reduce(capsys):
    code, out, _ = run(capsys, "reduce", "s")
    assert code == 0 and "case A" in out
    code, out, _ = run(capsys, "--m", "1", "--json", "reduce", "1+pi[1/2]*s")
    obj = json.loads(out)
    assert code == 0 and obj["case"] == "B" and obj["t"] == "1/6" and obj["w"] == "s"
    code, _, err = run(capsys, "reduce", "(1+s)^3")
    assert code == 2 and "TrivialCharacter" in err
    code, _, err = run(capsys, "reduce", "1+pi[1/2]*s")
    assert code == 2 and "--m 1" in err


def test_cli_swan(capsys):
    code, out, _ = run(capsys, "--json", "swan", "s")
    assert json.loads(out)["pairs"] == [{"delta": "3/2", "omega": "1"}]
    code, out, _ = run(capsys, "--json", "--m", "1", "swan", "1+pi[1/2]*s")
    assert json.loads(out)["pairs"] == [{"delta": "1", "omega": "s"}]
    code, out, _ = run(capsys, "--json", "--m", "1", "--auto-extend", "swan", "1+pi[1/2]*s",
                       "--z", "1+pi[1/2]*s^2")
    pairs = json.loads(out)["pairs"]
    assert code == 0 and len(pairs) == 2 and Fr(pairs[0]["delta"]) < Fr(pairs[1]["delta"])


def test_cli_validate_and_breaks(tmp_path, capsys):
    good = tmp_path / "good.json"
    good.write_text(json.dumps({"p": 3, "pairs": [{"delta": "3/2", "omega": "1"}]}))
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"p": 3, "pairs": [{"delta": "1/3", "omega": "1"}]}))
    assert run(capsys, "validate", str(good))[0] == 0
    code, out, _ = run(capsys, "validate", str(bad))
    assert code == 1 and "thm1.i.b" in out
    code, out, _ = run(capsys, "--p", "2", "breaks", "1", "2", "5")
    assert code == 0 and out.strip().endswith("pass")
    assert run(capsys, "--p", "2", "breaks", "1", "4")[0] == 1


def test_cli_construct_minimize(tmp_path, capsys):
    f = tmp_path / "d.json"
    f.write_text(json.dumps({"p": 3, "pairs": [{"delta": "3/2", "omega": "1"}]}))
    code, out, _ = run(capsys, "construct", str(f))
    assert code == 0 and "ubar = s" in out
    code, out, _ = run(capsys, "--json", "--m", "2", "minimize", "1+pi[7/6]*s")
    obj = json.loads(out)
    assert code == 0 and obj["deltas"][-1] == "1"
    assert [q["delta"] for q in obj["datum"]["pairs"]] == ["1/3", "1"]


def test_cli_enumerate_selftest(capsys):
    code, out, _ = run(capsys, "--json", "enumerate", "--step", "1/2", "--n", "1")
    data = json.loads(out)
    assert code == 0 and data and all(len(d["pairs"]) == 1 for d in data)
    code, out, _ = run(capsys, "selftest", "hyodo")
    assert code == 0 and "PASS hyodo" in out


def test_cli_deterministic(capsys):
    a = run(capsys, "--json", "--seed", "5", "enumerate", "--step", "1/6")[1]
    b = run(capsys, "--json", "--seed", "5", "enumerate", "--step", "1/6")[1]
    assert a == b
