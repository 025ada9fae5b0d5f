# plgroup_module/analysis/__init__.py
"""Bounded whole-group analysis"""
