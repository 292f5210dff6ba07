# Shared helpers: errors, seeding, union-find
