"""Classifying spaces for commutativity of finite groups and their mod-l homology."""

__version__ = "0.1.0"
