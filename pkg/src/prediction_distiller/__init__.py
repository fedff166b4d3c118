"""prediction_distiller: destilación de datasets por emparejamiento adversarial de predicciones."""

__version__ = "0.1.0"
