"""Numerical engines package"""
