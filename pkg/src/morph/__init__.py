# Morph package initialization
