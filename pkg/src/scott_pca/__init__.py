"""Scott's graph model, assemblies over it, and the Sierpinski object, with fuel-bounded evaluation."""
__version__ = "0.1.0"
