# engine/ - Exact angle arithmetic, strata residue predicates, run logging
