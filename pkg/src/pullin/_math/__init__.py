"""Mathematical utilities not stricly related to the device model.
Mostly wrappers around SciPy.
"""
