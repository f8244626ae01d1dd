# Cubica - exact cubical machinery for higher connections
