"""Integration tests for Milestone 2"""
