"""pgan-poison: generative poisoning attacks, defenses and evaluation."""
