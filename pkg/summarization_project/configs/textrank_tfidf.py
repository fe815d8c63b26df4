_base_ = [
    './_base_/summarizer.py',
    './_base_/tfidf.py',
]

summarizer = dict(method='textrank', a=0.0)
