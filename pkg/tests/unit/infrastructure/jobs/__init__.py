"""Job processing infrastructure tests."""
