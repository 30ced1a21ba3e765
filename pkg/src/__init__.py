"""pq-stirling - exact (p,q)-deformed Stirling, Bell and Touchard calculus"""

__version__ = "0.1.0"
