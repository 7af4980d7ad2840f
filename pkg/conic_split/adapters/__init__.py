"""
Adapters - the command-line surface and the file formats.
"""
