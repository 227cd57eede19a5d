"""Catalogued solution families, their verification and related identities."""
