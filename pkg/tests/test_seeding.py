from frobcat.seeding import mix64, rng_for


def test_mix64_is_deterministic_and_spread():
    assert mix64(1, 2) == mix64(1, 2)
    assert mix64(1, 2) != mix64(2, 1)
    assert mix64(0) != mix64(1)
    assert 0 <= mix64(12345, 678) < 2**64


def test_rng_for_streams_are_independent_of_order():
    a1 = rng_for(7, 0).integers(0, 1000, size=5)
    b1 = rng_for(7, 1).integers(0, 1000, size=5)
    b2 = rng_for(7, 1).integers(0, 1000, size=5)
    a2 = rng_for(7, 0).integers(0, 1000, size=5)
    assert a1.tolist() == a2.tolist()
    assert b1.tolist() == b2.tolist()
    assert a1.tolist() != b1.tolist()
