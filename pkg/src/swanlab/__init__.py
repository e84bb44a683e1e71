"""swanlab: refined Swan conductors of characters of order p and p^2 of
p-adic fields of imperfect residue field, computed exactly."""

from .errors import *  # noqa: F401,F403
from .valuation_lattice import (BreakSequence, EpsilonContext, HerbrandMap, ValGroup,
                                epsilon_of_breaks, in_lambda_epsilon, phi_of_breaks,
                                psi_of_breaks)
from .residue_field import (DiffForm, Fq, RatFun, cartier, d, dlog, get_fq,
                            solve_dlog, solve_exact)
from .constants import build_constants
from .local_field import (CaseA, CaseB, Elem, Frac, LocalField, canonical_form,
                          epsilon_lift, kummer_reduce)
from .fierce_extension import FierceExt, make_extension
from .datum import Cancellation, RamDatum, RamPair
from .datum_rules import (BreakSeqCharP, ValidationReport, check_hyodo,
                          enumerate_charp_breaks, enumerate_valid_data,
                          validate_charp_breaks, validate_thm1)
from .conductor import (CharP, CharTower, combine, construct_from_datum,
                        minimize_swan, ramification_datum, swan_p,
                        swan_p_norm_oracle, swan_tower)
from .serialize import datum_from_json, datum_to_json, parse_elem, parse_ratfun

__version__ = "0.1.0"
