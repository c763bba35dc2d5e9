"""Concrete syntax: lexer, parser, elaborator and pretty-printer."""
from naturaltt.surface.elaborate import Elaborator, desugar, elaborate_term
from naturaltt.surface.parser import parse, parse_term
from naturaltt.surface.pretty import pretty

__all__ = ["Elaborator", "desugar", "elaborate_term", "parse", "parse_term", "pretty"]
