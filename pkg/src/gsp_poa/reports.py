"""Plain-dict renderings of result objects, ready for ``json.dumps``."""

from __future__ import annotations

from .scalar import fmt, fmt_approx


class Renderer:
    def __init__(self, approx: bool = False):
        self.approx = approx

    def num(self, x) -> str:
        return fmt_approx(x) if self.approx else fmt(x)

    def point(self, p) -> list:
        return [self.num(p[0]), self.num(p[1])]

    def bound(self, rep) -> dict:
        env = rep.envelope
        return {
            "closed_form": self.num(rep.closed_form),
            "simplified": self.num(rep.simplified),
            "j0": rep.j0,
            "argmin": None if rep.argmin is None else {"auction": rep.argmin[0], "slot": rep.argmin[1]},
            "simplified_argmin": {"auction": rep.simplified_argmin[0], "slot": rep.simplified_argmin[1]},
            "envelope": {
                "hull": [self.point(p) for p in env.hull],
                "endpoints": [self.point(p) for p in env.endpoints],
                "weights": [self.num(w) for w in env.weights],
                "t": self.num(env.t),
            },
            "agree": rep.agree,
        }

    def welfare(self, w) -> dict:
        return {
            "total_value": self.num(w.total_value),
            "total_payment": self.num(w.total_payment),
            "total_proxy_value": self.num(w.total_proxy_value),
            "opt_total": self.num(w.opt_total),
            "ratio": self.num(w.ratio),
        }

    def equilibrium(self, rep) -> dict:
        return {
            "verdict": rep.verdict,
            "tolerance": self.num(rep.tolerance),
            "failing_bidders": list(rep.failing),
            "bidders": [
                {
                    "bidder": b.bidder,
                    "value": self.num(b.value),
                    "payment": self.num(b.payment),
                    "best_response_value": self.num(b.best_response_value),
                    "gap": self.num(b.gap),
                    "roi_slack": self.num(b.roi_slack),
                }
                for b in rep.bidders
            ],
        }

    def certificate(self, cert, verdict: bool, problems=()) -> dict:
        return {
            "auction": cert.auction,
            "case": cert.case,
            "k": cert.k,
            "alpha": self.num(cert.alpha),
            "q": self.point(cert.q),
            "r": self.point(cert.r),
            "opt": self.num(cert.opt),
            "total_proxy_value": self.num(cert.total_proxy_value),
            "total_payment": self.num(cert.total_payment),
            "charges": [
                {
                    "rank": ch.rank,
                    "bidder": ch.bidder,
                    "amount": self.num(ch.amount),
                    "mass_points": [[p.column, p.row] for p in ch.points],
                }
                for ch in cert.charges
            ],
            "ledger": [
                {"label": e.label, "lhs": self.num(e.lhs), "rhs": self.num(e.rhs), "holds": e.holds}
                for e in cert.ledger
            ],
            "verified": verdict,
            "problems": list(problems),
        }

    def search(self, rep) -> dict:
        return {
            "profiles_checked": rep.profiles_checked,
            "equilibria_found": len(rep.equilibria),
            "min_ratio": "none" if rep.min_ratio is None else self.num(rep.min_ratio),
            "bound": None if rep.bound is None else self.num(rep.bound),
            "dominates": rep.dominates,
            "equilibria": [
                {
                    "bids": [[self.num(b) for b in row] for row in f.bids.bids],
                    "ratio": self.num(f.ratio),
                    "total_value": self.num(f.total_value),
                    "total_payment": self.num(f.total_payment),
                    "total_proxy_value": self.num(f.total_proxy_value),
                }
                for f in rep.equilibria
            ],
        }
