"""Exact computations with n-ary Hom-algebras and their commutator brackets."""
