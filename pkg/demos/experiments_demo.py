# Batch checks at small size (the command line runs the same code).
from quasitrivial.experiments import (commvar_tangent_sample, verify_dimension, verify_empty,
                                      verify_symn)

print("r > n:", verify_empty(3, 2, trials=20, seed=1)["ok"])
rep = verify_symn(3, trials=20, seed=1)
print("r = n:", rep["ok"], rep["statuses"])
rep = verify_dimension(3, 5, trials=3, seed=1)
print("dimension:", rep["ext1"], "expected", rep["expected_ext1"], rep["retry_histogram"])
rep = commvar_tangent_sample(3, trials=6, seed=0)
print("commuting triples, n = 3:", rep["histogram"], "generic", rep["generic_dim"])
