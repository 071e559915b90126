"""Gabriel quivers of complex algebras of affine monoids of finite commutative rings."""
