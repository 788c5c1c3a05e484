"""Key generation, signing, and verification at toy scale.

Also shows the two ways a signature can fail to exist or to verify:
the counter search can exhaust (the signer refuses the message), and
a tampered message flips the recomputed syndrome.
"""

from ldgmsig import CounterExhausted, assemble, get_params, sign_trace, verify

ps = get_params("toy-1")
seed = bytes(range(32))
sk, pk = assemble(ps, seed)
print(f"{ps.name}: n={ps.n} k={ps.k} p={ps.p}, "
      f"public key {pk.payload_bits()} payload bits")
print(f"signature weight bound {ps.sig_weight_bound}")
print()

signed = 0
for i in range(8):
    message = b"walkthrough message %d" % i
    try:
        sig, trace = sign_trace(sk, message)
    except CounterExhausted as exc:
        # some digests admit no valid counter; the signer says so
        print(f"message {i}: unsignable ({exc})")
        continue
    verdict = verify(pk, message, sig)
    print(f"message {i}: counter {sig.theta} after {trace.tries} tries, "
          f"weight {sig.e_prime.weight()}, verify -> {verdict.accepted}")
    signed += 1

print(f"\nsigned {signed}/8")

message = b"the original text"
sig, _ = sign_trace(sk, message)
verdict = verify(pk, b"the altered text", sig)
print(f"tampered message -> accepted={verdict.accepted} "
      f"(reason: {verdict.reason})")

# determinism: same key, same message, same bytes
again, _ = sign_trace(sk, message)
print(f"re-signing is byte-identical: "
      f"{again.e_prime.to_bytes() == sig.e_prime.to_bytes()}")
