# Nonrelativistic spin-1/2 laboratory
