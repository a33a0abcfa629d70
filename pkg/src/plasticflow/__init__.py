"""plasticflow: exact solution catalog, residual verification and
extrusion-die geometry for planar ideal-plastic flow."""

__version__ = "0.1.0"
