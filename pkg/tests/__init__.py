"""Test suite for medical PDF processing pipeline"""
