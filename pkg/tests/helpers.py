"""Small constructors shared by the tests."""

from fihom.category import FiniteGroup, Morphism
from fihom.linalg import PrimeField, RationalField
from fihom.modules import Presentation, Relation, compile_presentation

F101 = PrimeField(101)
QQ = RationalField()


def group(order=1):
    return FiniteGroup.cyclic(order)


def presentation(gens, rels=(), order=1, field=F101, window=None):
    """``rels`` holds ``(degree, [(gen, injection, colours, coeff), ...])``."""
    G = group(order)
    relations = [Relation(d, [(g, Morphism(gens[g], d, tuple(inj), tuple(cols)), c)
                              for g, inj, cols, c in terms]) for d, terms in rels]
    return Presentation(field, G, list(gens), relations, window)


def module(gens, rels=(), order=1, field=F101, window=6):
    return compile_presentation(presentation(gens, rels, order, field, window))


def k0(window=6, field=F101, order=1):
    return module([0], [(1, [(0, (), (), 1)])], order=order, field=field, window=window)


def corpus_module(trial, field="101", order=2, gmax=2, rmax=2, extra=1, seed=11):
    """A random presented module on a window certifying gd, td and hd_1."""
    from fihom.harness import FuzzConfig, random_presentation, trial_base_window, trial_rng

    cfg = FuzzConfig(seed=seed, field=field, group_order=order, gmax=gmax, rmax=rmax, relmax=3)
    P = random_presentation(trial_rng(cfg.seed, trial), cfg)
    P.window = trial_base_window(P.bounds, 1) + extra
    return P, compile_presentation(P)
