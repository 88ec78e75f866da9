"""bubblescope: snarls and superbubbles through block-cut trees and SPQR trees."""

__version__ = "0.1.0"
