"""
GMELab test suite
"""