"""Free boundary minimal annuli in space-form balls and the pinching gap Q <= 2."""

__version__ = "0.1.0"
