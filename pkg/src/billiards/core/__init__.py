"""Exact-arithmetic billiard kernel for the P_alpha table family."""
