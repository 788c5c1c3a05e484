"""Run every attack experiment at toy scale and print the outcomes.

Each experiment demonstrates why one design element exists:

* linearity_forge vs the zero-mask ablation: without the mask codeword
  c, signatures are linear in the syndrome and combine freely;
* right_inverse_forge: a dense right inverse of H' meets the syndrome
  equation but lands near weight n/2, which full-scale sets reject;
* support_decompose vs the permutation ablation: permutations instead
  of Q, S leak the bit reordering to frequency statistics;
* isd_codeword_strip: information sets strip the mask from a single
  signature with the predicted escape probability;
* low_weight_row_recovery: the public code inherits sparse generator
  rows, recoverable at toy scale by Lee-Brickell search.
"""

from ldgmsig import assemble, get_params
from ldgmsig.attacks import (
    SignatureTranscript,
    build_permutation_keypair,
    isd_codeword_strip,
    linearity_forge,
    low_weight_row_recovery,
    right_inverse_forge,
    support_decompose,
)

ps = get_params("toy-1")
seed = bytes(range(32))
sk, pk = assemble(ps, seed)


def show(outcome):
    print(f"{outcome.attack}: success={outcome.success} work={outcome.work}")
    for key, value in outcome.details.items():
        print(f"    {key} = {value}")


unmasked = SignatureTranscript.collect(sk, 48, zero_mask=True)
show(linearity_forge(pk, unmasked, b"a message the signer never saw"))

show(right_inverse_forge(pk, b"another unseen message"))

# chosen-message transcript: every syndrome shares position 0
skp, pkp, pi1, pi2 = build_permutation_keypair(ps, seed)
conditioned = SignatureTranscript.collect(
    skp, 32, zero_mask=True, want=lambda s: 0 in s.support())
show(support_decompose(pkp, conditioned))

masked = SignatureTranscript.collect(sk, 32)
show(isd_codeword_strip(masked.pairs[0], pk, budget=5000, seed=seed))

show(low_weight_row_recovery(pk, ps.w_g * ps.m_s, budget=10 ** 6, seed=seed))
