"""
Command-line front end: state specs, commands and reports
"""
