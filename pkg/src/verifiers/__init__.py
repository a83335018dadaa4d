# Verifiers package initialization
