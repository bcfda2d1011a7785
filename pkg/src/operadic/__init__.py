"""Operadic categories of trees and levelled trees."""
