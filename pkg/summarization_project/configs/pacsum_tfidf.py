_base_ = [
    './_base_/summarizer.py',
    './_base_/tfidf.py',
]

summarizer = dict(method='pacsum', a=0.6, beta1=1.0, beta2=0.0)
