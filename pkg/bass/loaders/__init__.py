# Configuration loaders
