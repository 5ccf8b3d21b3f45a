"""
Test suite for Gibbs Explorer

Unit tests per package plus end-to-end CLI runs. Every module also runs
standalone without pytest.
"""
