# Adelic polytopes: exact volumes, lattice-point counts and Blichfeldt-type bounds
