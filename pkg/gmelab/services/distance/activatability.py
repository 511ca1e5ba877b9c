"""
GME-activatability from negativity on every cut
"""
from ...core.config import settings
from ...core.logging import get_logger
from ...models.certificates import ActivatabilityCertificate, ActivatabilityVerdict, Verdict
from ...models.domain import DensityMatrix
from ..criteria import certify_cut_separable, factorize_product, product_negativity
from ..partitions import enumerate_bipartitions

logger = get_logger(__name__)


def activatable_via_npt(rho: DensityMatrix) -> ActivatabilityCertificate:
    """
    A state NPT across every cut is not partially separable, hence some
    number of copies is GME. A cut certified separable rules this out.

    The product structure is found once and reused on every cut, so a
    regrouped multi-copy state only pays for its small blocks.
    """
    n = rho.layout.require_contiguous_parties()
    groups = factorize_product(rho)
    negativities = {}
    verdicts = []
    separable_cut = None

    for cut in enumerate_bipartitions(n):
        negativities[cut.label] = product_negativity(rho, cut, groups)
        cut_verdict = certify_cut_separable(rho, cut, groups)
        verdicts.append(cut_verdict)
        if separable_cut is None and cut_verdict.verdict == Verdict.SEPARABLE:
            separable_cut = cut.label

    if all(v > settings.tolerances.npt_activatable for v in negativities.values()):
        verdict = ActivatabilityVerdict.ACTIVATABLE
    elif separable_cut is not None:
        verdict = ActivatabilityVerdict.NOT_ACTIVATABLE
    else:
        verdict = ActivatabilityVerdict.INCONCLUSIVE

    logger.info("Activatability", verdict=verdict.value, separable_cut=separable_cut)
    return ActivatabilityCertificate(
        negativities=negativities,
        verdict=verdict,
        separable_cut=separable_cut,
        cut_verdicts=tuple(verdicts),
    )
