# deciders/ - Realizability deciders (literal criteria, strata reduction, class comparison)
