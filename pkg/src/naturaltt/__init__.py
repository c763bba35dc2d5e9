"""Proof-checking kernel for dependent type theory with the natural modality."""
from naturaltt.diagnostics import Diagnostic, TypeCheckError
from naturaltt.kernel import Checker, Environment, GlobalDef, Signature

__all__ = ["Checker", "Diagnostic", "Environment", "GlobalDef", "Signature", "TypeCheckError"]
__version__ = "0.1.0"
