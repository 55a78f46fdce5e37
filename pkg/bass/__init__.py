"""Bayesian adaptive smoothing splines on sparse SDE-derived GMRFs"""
