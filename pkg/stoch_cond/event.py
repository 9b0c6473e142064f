class Events:
    INFERENCE_START = 'inference:start'
    INFERENCE_STEP = 'inference:step'
    INFERENCE_END = 'inference:end'


DEFAULT_EVENTS = [
    Events.INFERENCE_START,
    Events.INFERENCE_STEP,
    Events.INFERENCE_END,
]
