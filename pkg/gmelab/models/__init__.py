"""
Domain models, certificates and schemas for GMELab
"""
