"""Tests package for SecondBrain."""
