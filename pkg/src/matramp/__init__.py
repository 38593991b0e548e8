"""State matrixization toolkit: block encodings of bipartite states and overlap estimation."""
