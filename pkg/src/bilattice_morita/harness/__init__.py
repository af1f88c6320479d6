"""Instance files, seeded generators, brute-force oracles and the law suite."""
