"""Unit test package for gauss_randpoly."""
