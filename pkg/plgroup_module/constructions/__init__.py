# plgroup_module/constructions/__init__.py
"""Explicit groups with certificates, and the embedding drivers"""
