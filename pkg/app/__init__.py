# Key graph connectivity toolkit
__version__ = "1.0.0"
