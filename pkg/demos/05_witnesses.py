"""Building sequences with a prescribed set of common factors.

Asks for a 2-automatic and a 3-automatic sequence whose common factors are
exactly those of ...1110111...; the construction returns two automata,
which are checked length by length and then re-analysed from scratch.
"""

from substrata import analyze_common_factors, construct_witnesses, verify_witness
from substrata.words import BiWordTriple

triples = [BiWordTriple(("1",), ("0",), ("1",))]
pair = construct_witnesses(triples, 2, 3)
# each base is replaced by a power of itself large enough for the layout
print("bases:", pair.k, pair.l, "params:", pair.params)
print("states:", len(pair.x_spec.phi.alphabet), len(pair.y_spec.phi.alphabet))
print("x:", " ".join(pair.x_spec.prefix(24)))
print("y:", " ".join(pair.y_spec.prefix(24)))
print("strata:", [s.status() for s in verify_witness(pair.x_spec, pair.y_spec, triples, 10)])
print("recovered:", [t.text() for t in analyze_common_factors(pair.x_spec, pair.y_spec, 10).result.triples])
