"""Cogrowth toolkit - obstructions and Gröbner bases for algebras and infinite words."""
