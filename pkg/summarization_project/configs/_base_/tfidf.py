encoder = dict(
    kind='tfidf',
    tfidf_scope='per-document',  # or 'per-corpus'
    normalize=True,
)
